#pragma once

#include "prosumgrid/csv.hpp"
#include "prosumgrid/grid_flow.hpp"
#include "prosumgrid/lp/mps.hpp"
#include "prosumgrid/lp/problem.hpp"
#include "prosumgrid/lp/simplex.hpp"
#include "prosumgrid/market.hpp"
#include "prosumgrid/pipeline.hpp"
#include "prosumgrid/prosumage.hpp"
#include "prosumgrid/redispatch.hpp"
#include "prosumgrid/report.hpp"
#include "prosumgrid/scenario.hpp"
#include "prosumgrid/scenario_io.hpp"
#include "prosumgrid/study.hpp"
#include "prosumgrid/synthetic.hpp"
