#pragma once

#include "dsig/error.hpp"
#include "dsig/events.hpp"
#include "dsig/experiment.hpp"
#include "dsig/features.hpp"
#include "dsig/logistic.hpp"
#include "dsig/market.hpp"
#include "dsig/oracle.hpp"
#include "dsig/parallel.hpp"
#include "dsig/path.hpp"
#include "dsig/signature.hpp"
#include "dsig/synth.hpp"
#include "dsig/words.hpp"
