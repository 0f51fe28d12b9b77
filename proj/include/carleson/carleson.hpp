#pragma once

#include "carleson/error.hpp"
#include "carleson/geometry.hpp"
#include "carleson/measure.hpp"
#include "carleson/calculus/polynomial.hpp"
#include "carleson/calculus/laplacian.hpp"
#include "carleson/calculus/green.hpp"
#include "carleson/calculus/uchiyama.hpp"
#include "carleson/interpolation.hpp"
#include "carleson/extremal.hpp"
