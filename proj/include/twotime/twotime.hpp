#pragma once

#include "twotime/qcore.hpp"
#include "twotime/random.hpp"
#include "twotime/dynamics.hpp"
#include "twotime/correlators.hpp"
#include "twotime/realism.hpp"
#include "twotime/spinlab.hpp"
#include "twotime/gaussian.hpp"
#include "twotime/ensembles.hpp"
