#pragma once

#include "echelon/demand.hpp"
#include "echelon/env.hpp"
#include "echelon/experiment.hpp"
#include "echelon/horizon_eval.hpp"
#include "echelon/io.hpp"
#include "echelon/nsga2.hpp"
#include "echelon/objective.hpp"
#include "echelon/parallel.hpp"
#include "echelon/pareto.hpp"
#include "echelon/policy.hpp"
#include "echelon/policy_search.hpp"
#include "echelon/rng.hpp"
#include "echelon/scenario.hpp"
#include "echelon/scenario_io.hpp"
