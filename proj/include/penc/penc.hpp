#pragma once

// Polyadic residue-class codec: exact (m,n)-ring arithmetic over congruence
// classes, keyed encoding of bytes into ring parameters, integer amplitude
// signaling, and a framed wire protocol between sender and receiver.

#include "penc/codec.hpp"
#include "penc/errors.hpp"
#include "penc/pipeline.hpp"
#include "penc/prng.hpp"
#include "penc/ring.hpp"
#include "penc/shape_table.hpp"
#include "penc/signal.hpp"
#include "penc/transport.hpp"
#include "penc/wideint.hpp"
#include "penc/wire.hpp"
