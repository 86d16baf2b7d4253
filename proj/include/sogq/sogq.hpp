#pragma once

#include "chebyshev.hpp"
#include "fft.hpp"
#include "geometry.hpp"
#include "long_range.hpp"
#include "mid_range.hpp"
#include "near_field.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "sog_decomposition.hpp"
#include "solver.hpp"
#include "sweeps.hpp"
#include "windows.hpp"
