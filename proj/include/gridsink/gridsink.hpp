#pragma once

#include "gridsink/generate.hpp"
#include "gridsink/grid.hpp"
#include "gridsink/io.hpp"
#include "gridsink/oracles.hpp"
#include "gridsink/random.hpp"
#include "gridsink/solvers.hpp"
