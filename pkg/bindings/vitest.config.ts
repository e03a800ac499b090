import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // every operation spawns the core as a subprocess
    testTimeout: 120_000,
  },
});
