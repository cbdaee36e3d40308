#pragma once

#include "abtqft/cyclotomic.hpp"
#include "abtqft/intmat.hpp"
#include "abtqft/homology.hpp"
#include "abtqft/linalg.hpp"
#include "abtqft/heisenberg.hpp"
#include "abtqft/surgery.hpp"
#include "abtqft/cobordism.hpp"
#include "abtqft/mcg.hpp"
#include "abtqft/io.hpp"
