#pragma once

#include "supersolve/absorbing.hpp"
#include "supersolve/algebra.hpp"
#include "supersolve/bounds.hpp"
#include "supersolve/error.hpp"
#include "supersolve/malcev.hpp"
#include "supersolve/solver.hpp"
#include "supersolve/subset.hpp"
#include "supersolve/term.hpp"
#include "supersolve/witness.hpp"
