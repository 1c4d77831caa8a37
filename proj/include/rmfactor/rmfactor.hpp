#pragma once

#include <rmfactor/arith.hpp>
#include <rmfactor/bench.hpp>
#include <rmfactor/factor.hpp>
#include <rmfactor/gen.hpp>
