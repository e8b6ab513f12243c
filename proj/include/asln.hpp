#pragma once

#include "asln/errors.hpp"
#include "asln/numeric.hpp"
#include "asln/primes.hpp"
#include "asln/additive.hpp"
#include "asln/tables.hpp"
#include "asln/erdos_kac.hpp"
#include "asln/cache.hpp"
#include "asln/walk.hpp"
#include "asln/weights.hpp"
#include "asln/distribution.hpp"
#include "asln/criteria.hpp"
#include "asln/simulate.hpp"
#include "asln/report_io.hpp"
#include "asln/config.hpp"
#include "asln/svg.hpp"
