#pragma once

#include "wordeq/batch.hpp"
#include "wordeq/benchgen.hpp"
#include "wordeq/dataset.hpp"
#include "wordeq/errors.hpp"
#include "wordeq/gnn.hpp"
#include "wordeq/graph.hpp"
#include "wordeq/oracle.hpp"
#include "wordeq/problem_io.hpp"
#include "wordeq/proof_tree.hpp"
#include "wordeq/random.hpp"
#include "wordeq/rules.hpp"
#include "wordeq/search.hpp"
#include "wordeq/terms.hpp"
