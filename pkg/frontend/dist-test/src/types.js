"use strict";
/** Payload types mirroring the engine's HTTP JSON API. */
Object.defineProperty(exports, "__esModule", { value: true });
