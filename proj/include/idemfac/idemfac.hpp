#pragma once

#include "integer.hpp"
#include "error.hpp"
#include "quadring.hpp"
#include "pell.hpp"
#include "ideals.hpp"
#include "factorization.hpp"
#include "decision.hpp"
#include "serialize.hpp"
