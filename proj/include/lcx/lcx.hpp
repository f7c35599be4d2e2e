#pragma once

// Umbrella header for the whole toolkit.

#include "lcx/chernoff.hpp"
#include "lcx/classify.hpp"
#include "lcx/continuous.hpp"
#include "lcx/discrete.hpp"
#include "lcx/entropy.hpp"
#include "lcx/io.hpp"
#include "lcx/majorize.hpp"
#include "lcx/moments.hpp"
#include "lcx/oracle.hpp"
#include "lcx/rate.hpp"
#include "lcx/rng.hpp"
#include "lcx/suites.hpp"
