#pragma once

#include "gridbalance/bignum.hpp"
#include "gridbalance/errors.hpp"
#include "gridbalance/exact_mst.hpp"
#include "gridbalance/exact_sequences.hpp"
#include "gridbalance/grid_model.hpp"
#include "gridbalance/quadratic.hpp"
#include "gridbalance/random_sampling.hpp"
#include "gridbalance/random_source.hpp"
#include "gridbalance/report.hpp"
#include "gridbalance/spanning_enumeration.hpp"
