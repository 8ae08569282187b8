#pragma once

#include "modgauss/rational.hpp"
#include "modgauss/formal_sum.hpp"
#include "modgauss/graph.hpp"
#include "modgauss/permutation.hpp"
#include "modgauss/partition.hpp"
#include "modgauss/characters.hpp"
#include "modgauss/rng.hpp"
#include "modgauss/adjacency.hpp"
#include "modgauss/models.hpp"
#include "modgauss/observables.hpp"
#include "modgauss/cumulants.hpp"
#include "modgauss/stats.hpp"
