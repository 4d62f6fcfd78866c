#pragma once

#include "nskp/harness/metrics.hpp"
#include "nskp/harness/ns_reference.hpp"
#include "nskp/harness/sweep.hpp"
#include "nskp/harness/test_functions.hpp"
