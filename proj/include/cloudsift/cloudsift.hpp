#pragma once

// Convenience include for the whole library.

#include "cloudsift/analyzers.hpp"
#include "cloudsift/carver.hpp"
#include "cloudsift/codecs.hpp"
#include "cloudsift/evidence_tree.hpp"
#include "cloudsift/hash.hpp"
#include "cloudsift/locator.hpp"
#include "cloudsift/merge.hpp"
#include "cloudsift/model.hpp"
#include "cloudsift/plist.hpp"
#include "cloudsift/report.hpp"
#include "cloudsift/sqlite_reader.hpp"
