#pragma once

#include <string>

#include "anosovforge/catalog.hpp"
#include "anosovforge/flagdyn.hpp"
#include "anosovforge/perturb.hpp"
#include "anosovforge/pingpong.hpp"
#include "anosovforge/represent.hpp"
#include "anosovforge/suspension.hpp"

namespace anosov {

// Wire formats: rationals as "p/q", matrices as row-major arrays of such
// strings, words as arrays of signed integers, floats as JSON numbers.

std::string to_json(const Word& w);
Word word_from_json(const std::string& text);

std::string to_json(const Representation& rep);
Representation representation_from_json(const std::string& text);

std::string to_json(const Suspension& susp);
Suspension suspension_from_json(const std::string& text);

std::string to_json(const GrowthProfile& profile);
std::string to_tsv(const GrowthProfile& profile);

std::string to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);

std::string to_json(const CatalogEntry& entry);

std::string to_json(const UnipotentWitness& witness);
std::string to_json(const RhoKWitness& witness);

std::string to_json(const TauResult& result);
std::string to_json(const LahnResult& result);
std::string to_json(const DfbEvidence& evidence);
std::string to_json(const CoverageReport& report);
std::string to_json(const FiniteIndexGenerators& fig);
std::string to_json(const BalanceResult& result);

}  // namespace anosov
