#pragma once

#include "synckit/error.hpp"
#include "synckit/monoid.hpp"
#include "synckit/partition.hpp"
#include "synckit/network.hpp"
#include "synckit/connectivity.hpp"
#include "synckit/synchrony.hpp"
#include "synckit/classification.hpp"
#include "synckit/dynamics.hpp"
