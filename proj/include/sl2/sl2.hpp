#pragma once

#include "sl2/errors.hpp"
#include "sl2/util.hpp"
#include "sl2/autodiff.hpp"
#include "sl2/phase_space.hpp"
#include "sl2/geometry.hpp"
#include "sl2/expr.hpp"
#include "sl2/catalog.hpp"
#include "sl2/integrate.hpp"
#include "sl2/verify.hpp"
