#pragma once

#include "ddca/engine.hpp"
#include "ddca/errors.hpp"
#include "ddca/events.hpp"
#include "ddca/experiments.hpp"
#include "ddca/lcg.hpp"
#include "ddca/metrics.hpp"
#include "ddca/oracle.hpp"
#include "ddca/results_io.hpp"
#include "ddca/scenario.hpp"
#include "ddca/stream_io.hpp"
