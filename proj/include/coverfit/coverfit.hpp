#pragma once

#include "coverfit/bodies.hpp"
#include "coverfit/circumscribe.hpp"
#include "coverfit/common.hpp"
#include "coverfit/io.hpp"
#include "coverfit/nelder_mead.hpp"
#include "coverfit/polytopes.hpp"
#include "coverfit/records.hpp"
#include "coverfit/rotation.hpp"
#include "coverfit/rotation_search.hpp"
#include "coverfit/smith_topology.hpp"
