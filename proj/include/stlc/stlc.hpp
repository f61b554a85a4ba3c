#pragma once

#include "stlc/closed.hpp"
#include "stlc/diff.hpp"
#include "stlc/elaborate.hpp"
#include "stlc/errors.hpp"
#include "stlc/generator.hpp"
#include "stlc/json_io.hpp"
#include "stlc/krivine.hpp"
#include "stlc/plist.hpp"
#include "stlc/reduction.hpp"
#include "stlc/refocus.hpp"
#include "stlc/surface.hpp"
#include "stlc/term.hpp"
#include "stlc/types.hpp"
