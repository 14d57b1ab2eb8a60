#pragma once
/// @file kmsharp.hpp
/// @brief Convenience umbrella: the whole library in one include.

#include "kmsharp/scalar.hpp"
#include "kmsharp/schedule.hpp"
#include "kmsharp/table.hpp"
#include "kmsharp/transport.hpp"
#include "kmsharp/mincost.hpp"
#include "kmsharp/bounds.hpp"
#include "kmsharp/chain.hpp"
#include "kmsharp/rng.hpp"
#include "kmsharp/tightmap.hpp"
#include "kmsharp/rates.hpp"
