#pragma once

#include "level_arith.hpp"
#include "qseries.hpp"
#include "basis_search.hpp"
#include "eta_quotient.hpp"
#include "io.hpp"
#include "commands.hpp"
