// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "opineq/core_linalg.hpp"
#include "opineq/periodic_sweep.hpp"
#include "opineq/numradius.hpp"
#include "opineq/blockops.hpp"
#include "opineq/bounds.hpp"
#include "opineq/harness.hpp"
