#!/usr/bin/env node
/** Executable wrapper around {@link main}. */

import { main } from "./main";

process.exitCode = main(process.argv.slice(2));
