#pragma once

#include "nskp/solver/checkpoint.hpp"
#include "nskp/solver/energy.hpp"
#include "nskp/solver/initial_data.hpp"
#include "nskp/solver/params.hpp"
#include "nskp/solver/rhs.hpp"
#include "nskp/solver/simulation.hpp"
#include "nskp/solver/state.hpp"
#include "nskp/solver/stepper.hpp"
