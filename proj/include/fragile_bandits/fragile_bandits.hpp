#pragma once

#include "fragile_bandits/checks.hpp"
#include "fragile_bandits/engine.hpp"
#include "fragile_bandits/errors.hpp"
#include "fragile_bandits/fragility.hpp"
#include "fragile_bandits/generators.hpp"
#include "fragile_bandits/geometry.hpp"
#include "fragile_bandits/io.hpp"
#include "fragile_bandits/logistic.hpp"
#include "fragile_bandits/rng.hpp"
#include "fragile_bandits/suites.hpp"
#include "fragile_bandits/svg.hpp"
