#pragma once

#include "twi/arith.hpp"
#include "twi/invariants.hpp"
#include "twi/polygon.hpp"
#include "twi/seq.hpp"
#include "twi/series.hpp"
#include "twi/surfaces.hpp"
#include "twi/verify.hpp"
