import { defineConfig } from "vitest/config";

export default defineConfig({
    test: {
        testTimeout: 240_000,
        // CLI subprocesses dominate; parallel files would just contend
        fileParallelism: false,
    },
});
