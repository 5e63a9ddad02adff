#pragma once

#include "triprod/circle_function.hpp"
#include "triprod/error.hpp"
#include "triprod/estimate.hpp"
#include "triprod/gaussian.hpp"
#include "triprod/kernel.hpp"
#include "triprod/quadrature.hpp"
#include "triprod/rng.hpp"
#include "triprod/specdecomp.hpp"
#include "triprod/specfun.hpp"
#include "triprod/trilinear.hpp"
#include "triprod/version.hpp"
