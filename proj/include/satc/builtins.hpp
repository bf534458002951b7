#pragma once

#include "builtins/builtins.hpp"
#include "builtins/primes.hpp"
