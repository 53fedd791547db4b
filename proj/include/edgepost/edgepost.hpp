#pragma once

#include "edgepost/dataset.hpp"
#include "edgepost/engine.hpp"
#include "edgepost/errors.hpp"
#include "edgepost/io.hpp"
#include "edgepost/lattice.hpp"
#include "edgepost/logweight.hpp"
#include "edgepost/mobius.hpp"
#include "edgepost/model.hpp"
#include "edgepost/oracle.hpp"
#include "edgepost/study.hpp"
#include "edgepost/verify.hpp"
