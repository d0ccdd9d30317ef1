var cp = require("child_process");
module.exports = function run(cmd, args) {
  return cp.spawnSync(cmd, args || []).status;
};
