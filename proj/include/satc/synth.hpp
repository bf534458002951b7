#pragma once

#include "synth/arith.hpp"
#include "synth/float.hpp"
#include "synth/gadgets.hpp"
#include "synth/lookup.hpp"
