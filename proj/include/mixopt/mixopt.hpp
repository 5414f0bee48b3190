#pragma once

#include "mixopt/errors.hpp"
#include "mixopt/numeric.hpp"
#include "mixopt/polynomial.hpp"
#include "mixopt/polytope.hpp"
#include "mixopt/integer_opt.hpp"
#include "mixopt/mixed_opt.hpp"
#include "mixopt/io.hpp"
