#pragma once

#include "bitnum/flt.hpp"
#include "bitnum/literal.hpp"
#include "bitnum/rat.hpp"
#include "bitnum/size.hpp"
#include "bitnum/unat.hpp"
