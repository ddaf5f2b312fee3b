import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["test/**/*.test.ts"],
    testTimeout: 60000,
    hookTimeout: 90000,
    fileParallelism: false,
  },
});
