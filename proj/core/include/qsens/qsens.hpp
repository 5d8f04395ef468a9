#pragma once

#include "qsens/clock.hpp"
#include "qsens/moments.hpp"
#include "qsens/observable.hpp"
#include "qsens/random.hpp"
#include "qsens/sensitivity.hpp"
#include "qsens/spin.hpp"
#include "qsens/types.hpp"
