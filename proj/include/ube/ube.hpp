/*
   Copyright 2026 The ube-audit Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "ube/clustering.hpp"
#include "ube/embedding_io.hpp"
#include "ube/enumeration.hpp"
#include "ube/error.hpp"
#include "ube/haar.hpp"
#include "ube/multiple_testing.hpp"
#include "ube/name_prep.hpp"
#include "ube/null_cache.hpp"
#include "ube/proxy_analysis.hpp"
#include "ube/report.hpp"
#include "ube/reporting.hpp"
#include "ube/weat_core.hpp"
