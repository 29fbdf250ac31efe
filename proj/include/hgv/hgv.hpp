#pragma once

#include "hgv/audit.hpp"
#include "hgv/binomial.hpp"
#include "hgv/distribution.hpp"
#include "hgv/ensemble.hpp"
#include "hgv/errors.hpp"
#include "hgv/hypergraph.hpp"
#include "hgv/oracle.hpp"
#include "hgv/pauli.hpp"
#include "hgv/protocol.hpp"
#include "hgv/report.hpp"
#include "hgv/rng.hpp"
#include "hgv/stabilizer.hpp"
#include "hgv/statevector.hpp"
