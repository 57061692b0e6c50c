#pragma once

#include "cqc/analysis.hpp"
#include "cqc/circuit_cooling.hpp"
#include "cqc/experiment.hpp"
#include "cqc/model.hpp"
#include "cqc/problems/brute_force.hpp"
#include "cqc/problems/chain.hpp"
#include "cqc/problems/circuit.hpp"
#include "cqc/problems/factoring.hpp"
#include "cqc/problems/grover.hpp"
#include "cqc/protocol.hpp"
#include "cqc/qcore/evolution.hpp"
#include "cqc/qcore/snapshot.hpp"
#include "cqc/qcore/sparse_hermitian.hpp"
#include "cqc/qcore/state_vector.hpp"
