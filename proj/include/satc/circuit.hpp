#pragma once

#include "circuit/circuit.hpp"
#include "circuit/eval.hpp"
#include "circuit/io.hpp"
#include "circuit/metrics.hpp"
