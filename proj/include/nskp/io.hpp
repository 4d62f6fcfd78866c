#pragma once

#include "nskp/io/check_suite.hpp"
#include "nskp/io/config.hpp"
#include "nskp/io/outputs.hpp"
