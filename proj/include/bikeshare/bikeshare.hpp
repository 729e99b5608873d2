#pragma once

#include "bikeshare/baselines.hpp"
#include "bikeshare/common.hpp"
#include "bikeshare/encoding.hpp"
#include "bikeshare/evaluator.hpp"
#include "bikeshare/experiment.hpp"
#include "bikeshare/instance.hpp"
#include "bikeshare/metrics.hpp"
#include "bikeshare/nsga2.hpp"
#include "bikeshare/rng.hpp"
#include "bikeshare/scenarios.hpp"
#include "bikeshare/variation.hpp"
