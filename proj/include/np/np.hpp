#ifndef NP_NP_HPP
#define NP_NP_HPP

#include "np/closure.hpp"
#include "np/elementary.hpp"
#include "np/endomorphism.hpp"
#include "np/errors.hpp"
#include "np/group.hpp"
#include "np/json_io.hpp"
#include "np/nested_partition.hpp"
#include "np/parallel.hpp"
#include "np/partition_type.hpp"
#include "np/permutation.hpp"
#include "np/predicates.hpp"
#include "np/rank.hpp"
#include "np/semigroup.hpp"
#include "np/wreath.hpp"

#endif
