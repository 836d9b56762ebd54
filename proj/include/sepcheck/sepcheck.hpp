#pragma once

#include "sepcheck/error.hpp"
#include "sepcheck/linalg.hpp"
#include "sepcheck/states.hpp"
#include "sepcheck/random_states.hpp"
#include "sepcheck/verdict.hpp"
#include "sepcheck/criteria.hpp"
#include "sepcheck/bell.hpp"
#include "sepcheck/sic.hpp"
#include "sepcheck/operators.hpp"
#include "sepcheck/decomposition.hpp"
#include "sepcheck/harness.hpp"
#include "sepcheck/io.hpp"
