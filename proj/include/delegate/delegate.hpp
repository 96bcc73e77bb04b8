#pragma once

#include "delegate/rational.hpp"
#include "delegate/solvers.hpp"
#include "delegate/instance.hpp"
#include "delegate/io.hpp"
#include "delegate/floors.hpp"
#include "delegate/pricing.hpp"
#include "delegate/oracle.hpp"
#include "delegate/generators.hpp"
#include "delegate/randomized.hpp"
#include "delegate/robust.hpp"
#include "delegate/continuous.hpp"
