#pragma once

#include "qmin/baselines.hpp"
#include "qmin/errors.hpp"
#include "qmin/ledger.hpp"
#include "qmin/qkmeans.hpp"
#include "qmin/qms.hpp"
#include "qmin/qram.hpp"
#include "qmin/rng.hpp"
#include "qmin/statevector.hpp"
