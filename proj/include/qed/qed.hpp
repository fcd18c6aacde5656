#pragma once

/// Umbrella header: simulation and verification toolkit for many-server FCFS
/// queues in the square-root spare-capacity regime with lattice service laws.

#include "qed/arrivals.hpp"
#include "qed/checkers.hpp"
#include "qed/config.hpp"
#include "qed/convergence.hpp"
#include "qed/derived.hpp"
#include "qed/drift.hpp"
#include "qed/errors.hpp"
#include "qed/estimate.hpp"
#include "qed/event_sim.hpp"
#include "qed/finite_sim.hpp"
#include "qed/io.hpp"
#include "qed/limit_chain.hpp"
#include "qed/mgf.hpp"
#include "qed/reflected_walk.hpp"
#include "qed/runner.hpp"
#include "qed/scaling.hpp"
#include "qed/service.hpp"
#include "qed/stats.hpp"
#include "qed/tail_fit.hpp"
#include "qed/version.hpp"
#include "qed/waiting.hpp"
