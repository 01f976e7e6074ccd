#pragma once

#include "mixgeo/error.hpp"
#include "mixgeo/hermitian.hpp"
#include "mixgeo/state_space.hpp"
#include "mixgeo/spectral_metric.hpp"
#include "mixgeo/unitary_dynamics.hpp"
#include "mixgeo/interferometry.hpp"
#include "mixgeo/qubit_geodesics.hpp"
#include "mixgeo/bures.hpp"
#include "mixgeo/thermal.hpp"
#include "mixgeo/random.hpp"
