var cp = require("child_process");
var fs = require("fs");
exports.uptime = function () { return cp.execSync("uptime").toString(); };
exports.meminfo = function () { return fs.readFileSync("/proc/meminfo", "utf8"); };
