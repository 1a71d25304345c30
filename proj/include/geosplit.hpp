#pragma once

#include "geosplit/arith.hpp"
#include "geosplit/census.hpp"
#include "geosplit/closed_form.hpp"
#include "geosplit/coset_table.hpp"
#include "geosplit/errors.hpp"
#include "geosplit/family.hpp"
#include "geosplit/geodesics.hpp"
#include "geosplit/matrix.hpp"
#include "geosplit/parallel.hpp"
#include "geosplit/partition.hpp"
#include "geosplit/power_relations.hpp"
#include "geosplit/quadratic_form.hpp"
#include "geosplit/rational.hpp"
#include "geosplit/subgroup.hpp"
#include "geosplit/zeta.hpp"
