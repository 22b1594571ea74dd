#pragma once

#include "pdmsusy/bdd_solver.hpp"
#include "pdmsusy/errors.hpp"
#include "pdmsusy/ladder.hpp"
#include "pdmsusy/mass_profile.hpp"
#include "pdmsusy/numerics.hpp"
#include "pdmsusy/susy.hpp"
#include "pdmsusy/tridiagonal.hpp"
