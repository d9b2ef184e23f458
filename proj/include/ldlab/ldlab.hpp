#pragma once

#include "ldlab/divergences.hpp"
#include "ldlab/ldp_lab.hpp"
#include "ldlab/measures.hpp"
#include "ldlab/projections.hpp"
#include "ldlab/random_measures.hpp"
#include "ldlab/rng.hpp"
#include "ldlab/special.hpp"
