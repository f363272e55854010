#pragma once

// Convenience umbrella header.

#include "pathvar/bounds.hpp"
#include "pathvar/csv.hpp"
#include "pathvar/errors.hpp"
#include "pathvar/integrate.hpp"
#include "pathvar/ode.hpp"
#include "pathvar/paths.hpp"
#include "pathvar/pvariation.hpp"
#include "pathvar/signals.hpp"
#include "pathvar/truncated_variation.hpp"
