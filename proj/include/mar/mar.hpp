#pragma once

#include "mar/bounds.hpp"
#include "mar/costs.hpp"
#include "mar/equilibrium.hpp"
#include "mar/error.hpp"
#include "mar/experiments.hpp"
#include "mar/network.hpp"
#include "mar/optimum.hpp"
#include "mar/scenario.hpp"
#include "mar/simplex.hpp"
