# tests for shape-nerve-mcp
