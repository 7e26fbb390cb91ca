#pragma once

#include "photraj/core_model.hpp"
#include "photraj/dynamics1d.hpp"
#include "photraj/dynamics2d.hpp"
#include "photraj/errors.hpp"
#include "photraj/numerics.hpp"
#include "photraj/projection_energy.hpp"
#include "photraj/qpotential.hpp"
#include "photraj/validation.hpp"
