#pragma once

#include "cnselmer/arith.hpp"
#include "cnselmer/census.hpp"
#include "cnselmer/constants.hpp"
#include "cnselmer/error.hpp"
#include "cnselmer/f2linalg.hpp"
#include "cnselmer/graphs.hpp"
#include "cnselmer/randsim.hpp"
#include "cnselmer/report_io.hpp"
#include "cnselmer/rng.hpp"
#include "cnselmer/selmer.hpp"
