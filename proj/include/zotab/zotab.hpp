#pragma once

#include "zotab/tables.hpp"
#include "zotab/cp.hpp"
#include "zotab/structure.hpp"
#include "zotab/layer.hpp"
#include "zotab/rng.hpp"
#include "zotab/sis.hpp"
#include "zotab/estimator.hpp"
#include "zotab/oracle.hpp"
#include "zotab/fixtures.hpp"
#include "zotab/marginal_file.hpp"
#include "zotab/ucinet.hpp"
#include "zotab/report.hpp"
