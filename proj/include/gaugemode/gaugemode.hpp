#pragma once

#include "gaugemode/types.hpp"
#include "gaugemode/graph.hpp"
#include "gaugemode/spectrum.hpp"
#include "gaugemode/analytic.hpp"
#include "gaugemode/eigensolver.hpp"
#include "gaugemode/mode_analysis.hpp"
#include "gaugemode/multidim.hpp"
