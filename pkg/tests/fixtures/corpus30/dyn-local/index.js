module.exports = function load(mode) {
  return require("./impl-" + mode);
};
