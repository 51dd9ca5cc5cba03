#pragma once

#include "pulso/aggregation.hpp"
#include "pulso/attribution.hpp"
#include "pulso/error.hpp"
#include "pulso/lexicon.hpp"
#include "pulso/pipeline.hpp"
#include "pulso/record.hpp"
#include "pulso/stats.hpp"
#include "pulso/text.hpp"
#include "pulso/tweet.hpp"
#include "pulso/unicode.hpp"
