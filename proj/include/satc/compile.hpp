#pragma once

#include "compile/compiler.hpp"
#include "compile/plan.hpp"
#include "compile/verify.hpp"
