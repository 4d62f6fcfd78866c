#pragma once

#include "nskp/dispersive/admissibility.hpp"
#include "nskp/dispersive/decay.hpp"
#include "nskp/dispersive/propagators.hpp"
#include "nskp/dispersive/rescale.hpp"
#include "nskp/dispersive/strichartz.hpp"
