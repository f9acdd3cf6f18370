#pragma once

// Fixed example data: a factored Czech sentence and a short document.

#include <string>
#include <vector>

#include "qad/factors/factors.hpp"

namespace qad::oracle {

/// Czech sentence with entity factors, token level.
inline const std::string kTokenBlock =
    "Hlavní|p0 inspektor|p0 organizace|p0 RSPCA|p3 pro|p0 Nový|p2 Jižní|p2 Wales|p2 "
    "David|p1 O'Shannessy|p1 televizi|p0 ABC|p5 sdělil|p0 ,|p0 že|p0 dohled|p0 nad|p0 "
    "jatky|p0 a|p0 jejich|p0 kontroly|p0 by|p0 měly|p0 být|p0 v|p0 Austrálii|p2 "
    "samozřejmostí|p0 .|p0";

inline const std::string kSubwordBlock =
    "_Hlavní|p0 _inspektor|p0 _organizace|p0 _R|p3 SP|p3 CA|p3 _pro|p0 _Nový|p2 _Jižní|p2 "
    "_Wales|p2 _David|p1 _O|p1 '|p1 S|p1 han|p1 ness|p1 y|p1 _televizi|p0 _A|p5 BC|p5 "
    "_sdělil|p0 ,|p0 _že|p0 _dohled|p0 _nad|p0 _ja|p0 tky|p0 _a|p0 _jejich|p0 _kontroly|p0 "
    "_by|p0 _měly|p0 _být|p0 _v|p0 _Austrálii|p2 _samozřejmost|p0 í|p0 .|p0";

/// Token spans that produce the token block.
inline const std::vector<factors::EntitySpan> kEntitySpans{
    {3, 4, factors::EntityCategory::ORG},  {5, 8, factors::EntityCategory::LOC},
    {8, 10, factors::EntityCategory::PER}, {11, 12, factors::EntityCategory::PRO},
    {25, 26, factors::EntityCategory::LOC}};

/// Five consecutive sentences of one document.
inline const std::vector<std::string> kDocumentExample{
    "Netvrdím, že bakteriální celulóza jednou nahradí bavlnu, kůži, nebo jiné látky.",
    "Ale myslím, že by to mohl být chytrý a udržitelný přírůstek k našim stále vzácnějším "
    "přírodním zdrojům.",
    "Možná že se nakonec tyto bakterie neuplatní v módě, ale jinde.",
    "Zkuste si třeba představit, že si vypěstujeme lampu, židli, auto, nebo třeba dům.",
    "Má otázka tedy zní: Co byste si v budoucnu nejraději vypěstovali vy?"};

}  // namespace qad::oracle
