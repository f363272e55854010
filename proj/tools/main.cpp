// Command-line front door: CSV paths in, JSON reports out.
//
// Exit codes: 0 success, 2 usage, 3 domain error (including malformed CSV),
// 4 precondition failure (common discontinuities), 5 exhausted budget or
// non-convergence.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathvar/pathvar.hpp"

namespace {

using nlohmann::json;
using namespace pathvar;

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitPrecondition = 4;
constexpr int kExitBudget = 5;

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

void emit_report(const json& report, const std::string& output) {
    std::string text = report.dump(2);
    text.push_back('\n');
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output);
        if (!out) throw domain_error("cannot open '" + output + "' for writing");
        out << text;
    }
}

json maximizer_json(const std::vector<std::size_t>& idx) {
    json arr = json::array();
    for (std::size_t i : idx) arr.push_back(i);
    return arr;
}

LipschitzSpec parse_rhs(const std::string& spec, double alpha) {
    auto colon = spec.find(':');
    std::string name = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                params.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw domain_error("bad parameter '" + field + "' in --f " + spec);
            }
        }
    }
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw domain_error("--f " + name + " needs exactly " + std::to_string(n) +
                               " parameter(s)");
    };
    if (name == "linear") {
        need(1);
        if (alpha != 1.0) throw domain_error("linear family is 1-Lipschitz; use --alpha 1");
        return LipschitzSpec::linear(params[0]);
    }
    if (name == "power") {
        need(1);
        return LipschitzSpec::power(params[0], alpha);
    }
    if (name == "sine") {
        need(2);
        return LipschitzSpec::sine(params[0], params[1], alpha);
    }
    if (name == "affine") {
        need(2);
        if (alpha != 1.0) throw domain_error("affine family is 1-Lipschitz; use --alpha 1");
        return LipschitzSpec::affine(params[0], params[1]);
    }
    throw domain_error("unknown right-hand-side family: " + name);
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            out.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw domain_error("bad grid entry '" + field + "'");
        }
    }
    if (out.empty()) throw domain_error("empty grid");
    return out;
}

struct SweepRow {
    std::string family;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double p = 0.0, q = 0.0, alpha = 0.0;
    double exact_dev = 0.0, improved = 0.0, classical = 0.0, s = 0.0, s_tilde = 0.0;
    bool failed = false;
    std::string error;
};

std::string format_double(double v) { return pathvar::detail::format_double(v); }

void run_sweep_rows(std::vector<SweepRow>& rows, const Interval& iv) {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            SweepRow& row = rows[i];
            try {
                SignalRecipe recipe{signal_family_from_string(row.family), {}, row.n, row.seed};
                SampledPath f = generate(recipe, iv);
                SignalRecipe recipe_g = recipe;
                recipe_g.seed = row.seed + 1;
                SampledPath g = generate(recipe_g, iv);
                Interval span = f.span();
                double dg = g.eval(span.hi) - g.eval(span.lo);
                row.exact_dev = std::abs(exact_integral(f, g) - f.eval(span.lo) * dg);
                row.improved = improved_ly_bound(f, g, span, row.p, row.q, row.alpha);
                row.classical = classical_ly_bound(f, g, span, row.p, row.q);
                BoundReport rep = make_bound_report(f, g, span, row.p, row.q, row.alpha);
                row.s = rep.s;
                row.s_tilde = rep.s_tilde;
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
        }
    };
    std::size_t threads = std::min<std::size_t>(std::thread::hardware_concurrency() == 0
                                                    ? 1
                                                    : std::thread::hardware_concurrency(),
                                                rows.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analysis of sampled signals of finite p-variation: truncated variation, "
                 "p-variation, Young integrals with certified bounds, and integral equations "
                 "driven by irregular paths"};
    app.require_subcommand(1);
    std::function<void()> action;

    // ---- ttv ------------------------------------------------------------
    auto* ttv_cmd = app.add_subcommand("ttv", "truncated variation of one path");
    {
        static std::string input, output, interp = "linear", emit_approx, emit_lazy;
        static double delta = 0.0;
        ttv_cmd->add_option("input", input, "path CSV (t,value)")->required();
        ttv_cmd->add_option("--delta", delta, "truncation parameter (>= 0)")->required();
        ttv_cmd->add_option("--interp", interp, "linear|left-step|right-step");
        ttv_cmd->add_option("-o,--output", output, "report file (default stdout)");
        ttv_cmd->add_option("--emit-approximant", emit_approx,
                            "write the optimal delta/2-approximant CSV");
        ttv_cmd->add_option("--emit-lazy", emit_lazy, "write the lazy approximant CSV");
        ttv_cmd->callback([&]() {
            action = [&]() {
                SampledPath path = read_path_csv_file(input, interp_from_string(interp));
                TtvResult res = ttv_dp(path, delta);
                json rep;
                rep["command"] = "ttv";
                rep["value"] = res.value;
                rep["maximizer_indices"] = maximizer_json(res.maximizer);
                rep["params"] = {{"delta", delta}, {"interp", interp}, {"input", input}};
                if (delta > 0.0) {
                    SampledPath approx = optimal_approximant(path, delta);
                    rep["approximant_tv"] = total_variation(approx);
                    if (!emit_approx.empty()) write_path_csv_file(emit_approx, approx);
                    if (!emit_lazy.empty())
                        write_path_csv_file(emit_lazy, lazy_approximant(path, delta));
                }
                emit_report(rep, output);
            };
        });
    }

    // ---- pvar -----------------------------------------------------------
    auto* pvar_cmd = app.add_subcommand("pvar", "p-variation of one path");
    {
        static std::string input, output, interp = "linear";
        static double p = 1.0;
        pvar_cmd->add_option("input", input, "path CSV (t,value)")->required();
        pvar_cmd->add_option("--p", p, "variation index (> 0)")->required();
        pvar_cmd->add_option("--interp", interp, "linear|left-step|right-step");
        pvar_cmd->add_option("-o,--output", output, "report file (default stdout)");
        pvar_cmd->callback([&]() {
            action = [&]() {
                SampledPath path = read_path_csv_file(input, interp_from_string(interp));
                PvarResult res = pvar_dp(path, path.span(), p);
                json rep;
                rep["command"] = "pvar";
                rep["value"] = res.value;
                rep["p"] = p;
                rep["maximizer_indices"] = maximizer_json(res.maximizer);
                rep["params"] = {{"p", p}, {"interp", interp}, {"input", input}};
                if (p >= 1.0) rep["norm"] = pvar_norm(path, p);
                emit_report(rep, output);
            };
        });
    }

    // ---- integrate --------------------------------------------------------
    auto* int_cmd = app.add_subcommand("integrate", "certified Riemann-Stieltjes integral");
    {
        static std::string input_f, input_g, output, interp_f = "linear", interp_g = "linear";
        static std::string emit_indefinite, tags = "left";
        static double p = 1.5, q = 1.5, tol = 1e-6;
        int_cmd->add_option("integrand", input_f, "integrand CSV")->required();
        int_cmd->add_option("integrator", input_g, "integrator CSV")->required();
        int_cmd->add_option("--p", p, "integrand variation index")->required();
        int_cmd->add_option("--q", q, "integrator variation index")->required();
        int_cmd->add_option("--tol", tol, "certified error tolerance");
        int_cmd->add_option("--tags", tags, "left|mid|right tag placement");
        int_cmd->add_option("--interp-f", interp_f, "integrand interpolation");
        int_cmd->add_option("--interp-g", interp_g, "integrator interpolation");
        int_cmd->add_option("--emit-indefinite", emit_indefinite,
                            "write t -> integral_a^t f dg as CSV");
        int_cmd->add_option("-o,--output", output, "report file (default stdout)");
        int_cmd->callback([&]() {
            action = [&]() {
                SampledPath f = read_path_csv_file(input_f, interp_from_string(interp_f));
                SampledPath g = read_path_csv_file(input_g, interp_from_string(interp_g));
                TagMode mode = TagMode::left;
                if (tags == "mid") mode = TagMode::mid;
                else if (tags == "right") mode = TagMode::right;
                else if (tags != "left") throw domain_error("--tags must be left, mid or right");
                IntegralReport res = adaptive_integrate(f, g, p, q, tol, mode);
                json rep;
                rep["command"] = "integrate";
                rep["value"] = res.value;
                rep["error_bound"] = res.error_bound;
                rep["mesh"] = res.mesh;
                rep["refinements"] = res.refinements;
                rep["params"] = {{"p", p},           {"q", q},
                                 {"tol", tol},       {"tags", tags},
                                 {"alpha", default_alpha(p, q)},
                                 {"interp_f", interp_f}, {"interp_g", interp_g},
                                 {"integrand", input_f}, {"integrator", input_g}};
                if (!emit_indefinite.empty())
                    write_path_csv_file(emit_indefinite, indefinite_integral(f, g));
                emit_report(rep, output);
            };
        });
    }

    // ---- bound ------------------------------------------------------------
    auto* bound_cmd = app.add_subcommand("bound", "existence/error estimates for a pair of paths");
    {
        static std::string input_f, input_g, output, interp_f = "linear", interp_g = "linear";
        static double p = 1.5, q = 1.5;
        static double alpha = -1.0;
        bound_cmd->add_option("integrand", input_f, "integrand CSV")->required();
        bound_cmd->add_option("integrator", input_g, "integrator CSV")->required();
        bound_cmd->add_option("--p", p, "integrand variation index")->required();
        bound_cmd->add_option("--q", q, "integrator variation index")->required();
        bound_cmd->add_option("--alpha", alpha, "ladder exponent (default: interval midpoint)");
        bound_cmd->add_option("--interp-f", interp_f, "integrand interpolation");
        bound_cmd->add_option("--interp-g", interp_g, "integrator interpolation");
        bound_cmd->add_option("-o,--output", output, "report file (default stdout)");
        bound_cmd->callback([&]() {
            action = [&]() {
                SampledPath f = read_path_csv_file(input_f, interp_from_string(interp_f));
                SampledPath g = read_path_csv_file(input_g, interp_from_string(interp_g));
                std::optional<double> alpha_opt;
                if (alpha >= 0.0) alpha_opt = alpha;
                BoundReport res = make_bound_report(f, g, f.span(), p, q, alpha_opt);
                json rep;
                rep["command"] = "bound";
                rep["S"] = res.s;
                rep["S_tilde"] = res.s_tilde;
                rep["improved_ly"] = res.improved_ly;
                rep["classical_ly"] = res.classical_ly;
                rep["C_pq"] = res.c_pq;
                rep["min_tagged_bound"] = res.min_tagged_bound;
                rep["params"] = {{"p", res.p},         {"q", res.q},
                                 {"alpha", res.alpha}, {"beta", res.beta},
                                 {"gamma", res.gamma}, {"interp_f", interp_f},
                                 {"interp_g", interp_g}, {"integrand", input_f},
                                 {"integrator", input_g}};
                emit_report(rep, output);
            };
        });
    }

    // ---- solve-ode ----------------------------------------------------------
    auto* ode_cmd = app.add_subcommand("solve-ode",
                                       "solve y = y0 + integral F(y) dx by Picard iteration");
    {
        static std::string input, output, rhs_spec, emit_solution;
        static double alpha = 1.0, p = 1.5, y0 = 0.0, tol = 1e-8;
        static std::size_t max_iter = 200;
        static bool use_split = false;
        ode_cmd->add_option("driver", input, "driver CSV (continuous)")->required();
        ode_cmd->add_option("--f", rhs_spec,
                            "right-hand side, e.g. linear:1.0 power:0.5 sine:1,2 affine:1,0")
            ->required();
        ode_cmd->add_option("--alpha", alpha, "Lipschitz exponent in (0,1]");
        ode_cmd->add_option("--p", p, "driver variation index in (1,2)");
        ode_cmd->add_option("--y0", y0, "initial value");
        ode_cmd->add_option("--tol", tol, "fixed-point residual tolerance");
        ode_cmd->add_option("--max-iter", max_iter, "Picard iteration budget");
        ode_cmd->add_flag("--split", use_split, "interval splitting (alpha = 1 only)");
        ode_cmd->add_option("--emit-solution", emit_solution, "write the solution path CSV");
        ode_cmd->add_option("-o,--output", output, "report file (default stdout)");
        ode_cmd->callback([&]() {
            action = [&]() {
                SampledPath driver = read_path_csv_file(input, Interp::linear);
                OdeProblem prob{y0, parse_rhs(rhs_spec, alpha), driver, p, tol, max_iter};
                OdeSolution sol = use_split ? split_solve(prob) : solve(prob);
                json rep;
                rep["command"] = "solve-ode";
                rep["y_end"] = sol.path.value(sol.path.size() - 1);
                rep["residual"] = sol.residual;
                rep["iterations"] = sol.iterations;
                rep["pvar_norm"] = sol.pvar_norm;
                rep["radius"] = finite_or_null(sol.radius);
                rep["pieces"] = sol.piece_breaks.empty() ? 1 : sol.piece_breaks.size() - 1;
                rep["params"] = {{"f", rhs_spec},   {"alpha", alpha}, {"p", p},
                                 {"y0", y0},        {"tol", tol},     {"max_iter", max_iter},
                                 {"split", use_split}, {"driver", input}};
                if (!emit_solution.empty()) write_path_csv_file(emit_solution, sol.path);
                emit_report(rep, output);
            };
        });
    }

    // ---- gen-signal -----------------------------------------------------------
    auto* gen_cmd = app.add_subcommand("gen-signal", "generate a synthetic test signal");
    {
        static std::string family = "ramp", params_csv, output;
        static std::size_t n = 64;
        static std::uint64_t seed = 0;
        static double lo = 0.0, hi = 1.0;
        gen_cmd->add_option("--family", family, "ramp|weierstrass|midpoint-walk|jump-step")
            ->required();
        gen_cmd->add_option("--params", params_csv, "family parameters, comma separated");
        gen_cmd->add_option("--n", n, "sample count (>= 2)");
        gen_cmd->add_option("--seed", seed, "seed for randomized families");
        gen_cmd->add_option("--lo", lo, "interval start");
        gen_cmd->add_option("--hi", hi, "interval end");
        gen_cmd->add_option("-o,--output", output, "output CSV (sidecar at <output>.json)")
            ->required();
        gen_cmd->callback([&]() {
            action = [&]() {
                SignalRecipe recipe{signal_family_from_string(family),
                                    params_csv.empty() ? std::vector<double>{}
                                                       : parse_grid(params_csv),
                                    n, seed};
                SampledPath path = generate(recipe, Interval{lo, hi});
                json sidecar;
                sidecar["family"] = to_string(recipe.family);
                sidecar["params"] = recipe.params;
                sidecar["n"] = recipe.n;
                sidecar["seed"] = recipe.seed;
                sidecar["lo"] = lo;
                sidecar["hi"] = hi;
                sidecar["interp"] = to_string(path.interp());
                write_path_csv_file(output, path);
                emit_report(sidecar, output + ".json");
            };
        });
    }

    // ---- sweep ------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "bound-tightness table over a parameter grid");
    {
        static std::string families = "ramp", p_grid_csv = "1.5", q_grid_csv = "1.5";
        static std::string alpha_grid_csv, output;
        static std::size_t n = 64;
        static std::uint64_t seed = 1;
        static double lo = 0.0, hi = 1.0;
        sweep_cmd->add_option("--families", families, "comma separated signal families");
        sweep_cmd->add_option("--p-grid", p_grid_csv, "comma separated p values");
        sweep_cmd->add_option("--q-grid", q_grid_csv, "comma separated q values");
        sweep_cmd->add_option("--alpha-grid", alpha_grid_csv,
                              "comma separated alphas (default: per-(p,q) midpoint)");
        sweep_cmd->add_option("--n", n, "samples per generated path");
        sweep_cmd->add_option("--seed", seed, "base seed");
        sweep_cmd->add_option("--lo", lo, "interval start");
        sweep_cmd->add_option("--hi", hi, "interval end");
        sweep_cmd->add_option("-o,--output", output, "output CSV (default stdout)");
        sweep_cmd->callback([&]() {
            action = [&]() {
                std::vector<std::string> fams;
                {
                    std::stringstream ss(families);
                    std::string field;
                    while (std::getline(ss, field, ',')) fams.push_back(field);
                }
                auto ps = parse_grid(p_grid_csv);
                auto qs = parse_grid(q_grid_csv);
                std::vector<SweepRow> rows;
                for (const auto& fam : fams)
                    for (double p : ps)
                        for (double q : qs) {
                            std::vector<double> alphas;
                            if (!alpha_grid_csv.empty()) {
                                alphas = parse_grid(alpha_grid_csv);
                            } else {
                                try {
                                    alphas.push_back(default_alpha(p, q));
                                } catch (const std::exception&) {
                                    alphas.push_back(0.0);  // row will record the failure
                                }
                            }
                            for (double a : alphas) {
                                SweepRow row;
                                row.family = fam;
                                row.seed = seed;
                                row.n = n;
                                row.p = p;
                                row.q = q;
                                row.alpha = a;
                                rows.push_back(row);
                            }
                        }
                run_sweep_rows(rows, Interval{lo, hi});
                std::ostringstream out;
                out << "family,n,seed,p,q,alpha,exact_dev,improved_ly,classical_ly,S,S_tilde,"
                       "ratio_improved,ratio_classical,error\n";
                for (const auto& row : rows) {
                    out << row.family << ',' << row.n << ',' << row.seed << ','
                        << format_double(row.p) << ',' << format_double(row.q) << ','
                        << format_double(row.alpha) << ',';
                    if (row.failed) {
                        out << ",,,,,,," << '"' << row.error << '"' << '\n';
                        continue;
                    }
                    double ri = row.exact_dev > 0 ? row.improved / row.exact_dev
                                                  : std::numeric_limits<double>::infinity();
                    double rc = row.exact_dev > 0 ? row.classical / row.exact_dev
                                                  : std::numeric_limits<double>::infinity();
                    out << format_double(row.exact_dev) << ',' << format_double(row.improved)
                        << ',' << format_double(row.classical) << ',' << format_double(row.s)
                        << ',' << format_double(row.s_tilde) << ','
                        << (std::isfinite(ri) ? format_double(ri) : "inf") << ','
                        << (std::isfinite(rc) ? format_double(rc) : "inf") << ",\n";
                }
                if (output.empty()) {
                    std::cout << out.str();
                } else {
                    std::ofstream file(output);
                    if (!file) throw domain_error("cannot open '" + output + "' for writing");
                    file << out.str();
                }
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        action();
    } catch (const precondition_error& e) {
        std::cerr << "precondition error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << '\n';
        return kExitBudget;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return 0;
}
