#pragma once

#include "psw/analytic.hpp"
#include "psw/detector.hpp"
#include "psw/io.hpp"
#include "psw/math.hpp"
#include "psw/quasiprob.hpp"
#include "psw/states.hpp"
#include "psw/witness.hpp"
