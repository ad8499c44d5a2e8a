#pragma once

#include "fcoord/distributions.hpp"
#include "fcoord/errors.hpp"
#include "fcoord/grid.hpp"
#include "fcoord/io.hpp"
#include "fcoord/kernels.hpp"
#include "fcoord/operators.hpp"
#include "fcoord/scalar_function.hpp"
#include "fcoord/suites.hpp"
#include "fcoord/theorems.hpp"
#include "fcoord/types.hpp"
