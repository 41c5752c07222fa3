#pragma once

// Umbrella header: the whole library in one include.

#include "nclorentz/amplification.hpp"
#include "nclorentz/common.hpp"
#include "nclorentz/embedding.hpp"
#include "nclorentz/generators.hpp"
#include "nclorentz/io.hpp"
#include "nclorentz/lorentz.hpp"
#include "nclorentz/operator_matrix.hpp"
#include "nclorentz/rademacher.hpp"
#include "nclorentz/report.hpp"
#include "nclorentz/rng.hpp"
#include "nclorentz/scenarios.hpp"
#include "nclorentz/step_function.hpp"
