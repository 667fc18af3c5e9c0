#pragma once

#include "quadrature.hpp"
#include "specfun.hpp"
#include "kernels.hpp"
#include "grid_function.hpp"
#include "transform.hpp"
#include "convolve.hpp"
#include "inteq.hpp"
#include "io.hpp"
#include "verify.hpp"
