#pragma once

#include "tmv/cli.hpp"
#include "tmv/decision.hpp"
#include "tmv/extract.hpp"
#include "tmv/gadgets.hpp"
#include "tmv/oracle.hpp"
