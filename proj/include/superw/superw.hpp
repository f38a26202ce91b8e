#pragma once

#include "darboux.hpp"
#include "lie.hpp"
#include "linalg.hpp"
#include "poisson.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "starprod.hpp"
#include "suite.hpp"
#include "supercore.hpp"
#include "wslice.hpp"
