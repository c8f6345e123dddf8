#pragma once

#include "entangle/chain.hpp"
#include "entangle/chains.hpp"
#include "entangle/ensemble.hpp"
#include "entangle/errors.hpp"
#include "entangle/fitting.hpp"
#include "entangle/geometry.hpp"
#include "entangle/measures.hpp"
#include "entangle/oracle.hpp"
#include "entangle/reproduce.hpp"
#include "entangle/rng.hpp"
