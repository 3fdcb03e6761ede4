import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    testTimeout: 120_000,
    hookTimeout: 60_000,
    // The integration suite spawns one render service and shares it across
    // tests; keep files sequential so only one service runs at a time.
    fileParallelism: false,
  },
});
