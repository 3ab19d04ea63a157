#pragma once

#include "ttkit/case_study.hpp"
#include "ttkit/dot.hpp"
#include "ttkit/error.hpp"
#include "ttkit/galois.hpp"
#include "ttkit/lattice.hpp"
#include "ttkit/mask.hpp"
#include "ttkit/model.hpp"
#include "ttkit/poset.hpp"
#include "ttkit/space.hpp"
#include "ttkit/text_io.hpp"
