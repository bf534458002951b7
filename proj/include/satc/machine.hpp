#pragma once

#include "machine/attention.hpp"
#include "machine/eval.hpp"
#include "machine/expr.hpp"
#include "machine/host.hpp"
#include "machine/instrument.hpp"
#include "machine/run.hpp"
#include "machine/sexpr.hpp"
#include "machine/spec.hpp"
