#pragma once

#include "spopo/comb.hpp"
#include "spopo/coupling.hpp"
#include "spopo/errors.hpp"
#include "spopo/params.hpp"
#include "spopo/phase_matching.hpp"
#include "spopo/squeezing.hpp"
#include "spopo/supermodes.hpp"
#include "spopo/verify.hpp"
