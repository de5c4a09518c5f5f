#!/usr/bin/env node
function main() { return process.argv.length; }
main();
