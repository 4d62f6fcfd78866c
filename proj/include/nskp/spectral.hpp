#pragma once

#include "nskp/spectral/fft.hpp"
#include "nskp/spectral/field.hpp"
#include "nskp/spectral/grid.hpp"
#include "nskp/spectral/operators.hpp"
