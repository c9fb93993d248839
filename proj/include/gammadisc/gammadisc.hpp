#pragma once

#include "gammadisc/error.hpp"
#include "gammadisc/matrixkit.hpp"
#include "gammadisc/gamma.hpp"
#include "gammadisc/asymptotics.hpp"
#include "gammadisc/brown_halmos.hpp"
#include "gammadisc/dilation.hpp"
#include "gammadisc/toeplitz.hpp"
#include "gammadisc/lifting.hpp"
#include "gammadisc/report.hpp"
