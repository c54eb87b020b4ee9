#pragma once

#include "sparsepow/classify.hpp"
#include "sparsepow/errors.hpp"
#include "sparsepow/families.hpp"
#include "sparsepow/integer.hpp"
#include "sparsepow/oracle.hpp"
#include "sparsepow/records.hpp"
#include "sparsepow/repr.hpp"
