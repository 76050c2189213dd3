#pragma once

#include "dfmm/auction.hpp"
#include "dfmm/eldf.hpp"
#include "dfmm/error.hpp"
#include "dfmm/fixed.hpp"
#include "dfmm/ledger.hpp"
#include "dfmm/metrics.hpp"
#include "dfmm/pricing.hpp"
#include "dfmm/treasury.hpp"
#include "dfmm/vaults.hpp"
