#pragma once

#include "mlsig/bigint.hpp"
#include "mlsig/catalog.hpp"
#include "mlsig/construct.hpp"
#include "mlsig/errors.hpp"
#include "mlsig/factorize.hpp"
#include "mlsig/log_signature.hpp"
#include "mlsig/ls_io.hpp"
#include "mlsig/permutation.hpp"
#include "mlsig/pgm.hpp"
#include "mlsig/random.hpp"
#include "mlsig/stabilizer_chain.hpp"
